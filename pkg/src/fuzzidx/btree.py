"""In-memory B-tree of order m keyed by byte strings.

Nodes sit in a node store and are addressed by integer references; every
child fetch during a search goes through :meth:`BTree.disk_read`, which
counts it in ``node_reads``. That makes the disk-read cost of a lookup
measurable without real paging.

Insertion splits a node after it overflows (``m`` keys) rather than
splitting full nodes on the way down. Pre-emptive splitting cannot keep
the ``ceil(m/2)`` child minimum for odd orders such as ``m = 3``.
"""
from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Optional

NodeRef = int


class DuplicateKeyError(KeyError):
    pass


@dataclass
class BTreeNode:
    keys: list[bytes] = field(default_factory=list)
    children: list[NodeRef] = field(default_factory=list)
    leaf: bool = True
    payloads: list[Any] = field(default_factory=list)


class BTree:
    def __init__(self, order: int = 64):
        if order < 3:
            raise ValueError(f"B-tree order must be >= 3, got {order}")
        self.order = order
        self.node_reads = 0
        self._nodes: list[BTreeNode] = []
        self._size = 0
        self.root: NodeRef = self.new_node(BTreeNode())

    # node store

    def new_node(self, node: BTreeNode) -> NodeRef:
        self._nodes.append(node)
        return len(self._nodes) - 1

    def node(self, ref: NodeRef) -> BTreeNode:
        return self._nodes[ref]

    def disk_read(self, ref: NodeRef) -> BTreeNode:
        self.node_reads += 1
        return self._nodes[ref]

    def __len__(self) -> int:
        return self._size

    @property
    def min_children(self) -> int:
        return math.ceil(self.order / 2)

    def height(self) -> int:
        h, node = 1, self.node(self.root)
        while not node.leaf:
            node = self.node(node.children[0])
            h += 1
        return h

    # search

    def search(
        self, k: bytes, x: Optional[NodeRef] = None, trace: Optional[list] = None
    ) -> Optional[tuple[NodeRef, int]]:
        """B-TREE-SEARCH: returns ``(node_ref, i)`` with ``keys[i] == k``, or None.

        ``trace`` (if given) receives ``(node_ref, i)`` for every node
        visited, ``i`` being the branch index chosen there.
        """
        if x is None:
            x = self.root
        node = self.node(x)
        n = len(node.keys)
        i = 0
        while i < n and k > node.keys[i]:
            i += 1
        if trace is not None:
            trace.append((x, i))
        if i < n and k == node.keys[i]:
            return x, i
        if node.leaf:
            return None
        child = node.children[i]
        self.disk_read(child)
        return self.search(k, child, trace)

    def get(self, k: bytes, default: Any = None) -> Any:
        hit = self.search(k)
        if hit is None:
            return default
        ref, i = hit
        return self.node(ref).payloads[i]

    def __contains__(self, k: bytes) -> bool:
        return self.search(k) is not None

    # insertion

    def insert(self, k: bytes, payload: Any = None) -> None:
        split = self._insert(self.root, k, payload)
        if split is not None:
            mk, mv, right = split
            self.root = self.new_node(BTreeNode([mk], [self.root, right], False, [mv]))
        self._size += 1

    def _insert(self, ref: NodeRef, k: bytes, payload: Any):
        node = self.node(ref)
        i = bisect_left(node.keys, k)
        if i < len(node.keys) and node.keys[i] == k:
            raise DuplicateKeyError(k)
        if node.leaf:
            node.keys.insert(i, k)
            node.payloads.insert(i, payload)
        else:
            split = self._insert(node.children[i], k, payload)
            if split is not None:
                mk, mv, right = split
                node.keys.insert(i, mk)
                node.payloads.insert(i, mv)
                node.children.insert(i + 1, right)
        if len(node.keys) >= self.order:
            return self._split(node)
        return None

    def _split(self, node: BTreeNode):
        mid = len(node.keys) // 2
        right = BTreeNode(
            node.keys[mid + 1 :],
            node.children[mid + 1 :] if not node.leaf else [],
            node.leaf,
            node.payloads[mid + 1 :],
        )
        mk, mv = node.keys[mid], node.payloads[mid]
        del node.keys[mid:], node.payloads[mid:]
        if not node.leaf:
            del node.children[mid + 1 :]
        return mk, mv, self.new_node(right)

    @classmethod
    def from_sorted(cls, items: Iterable[tuple[bytes, Any]], order: int = 64) -> "BTree":
        """Bulk-build from strictly increasing ``(key, payload)`` pairs in O(n)."""
        items = list(items)
        for (a, _), (b, _) in zip(items, items[1:]):
            if not a < b:
                raise ValueError("bulk load requires strictly increasing keys")
        tree = cls(order)
        if not items:
            return tree
        height = 1
        while tree._max_size(height) < len(items):
            height += 1
        tree._nodes.clear()
        tree.root = tree._build(items, 0, len(items), height, is_root=True)
        tree._size = len(items)
        return tree

    def _max_size(self, height: int) -> int:
        return self.order**height - 1

    def _min_size(self, height: int) -> int:
        # smallest legal non-root subtree of this height
        return self.min_children**height - 1

    def _build(self, items, lo: int, hi: int, height: int, is_root: bool) -> NodeRef:
        count = hi - lo
        if height == 1:
            return self.new_node(
                BTreeNode([k for k, _ in items[lo:hi]], [], True, [v for _, v in items[lo:hi]])
            )
        lo_c = 2 if is_root else self.min_children
        min_sub, max_sub = self._min_size(height - 1), self._max_size(height - 1)
        for c in range(lo_c, self.order + 1):
            if c * min_sub <= count - (c - 1) <= c * max_sub:
                break
        else:
            raise AssertionError(f"no legal fan-out for {count} keys at height {height}")
        per, extra = divmod(count - (c - 1), c)
        node = BTreeNode(leaf=False)
        pos = lo
        for child in range(c):
            size = per + (child < extra)
            node.children.append(self._build(items, pos, pos + size, height - 1, False))
            pos += size
            if child < c - 1:
                node.keys.append(items[pos][0])
                node.payloads.append(items[pos][1])
                pos += 1
        return self.new_node(node)

    # traversal / validation

    def items(self) -> Iterator[tuple[bytes, Any]]:
        """In-order ``(key, payload)`` pairs."""
        stack: list[tuple[NodeRef, int]] = [(self.root, 0)]
        while stack:
            ref, i = stack.pop()
            node = self.node(ref)
            if node.leaf:
                yield from zip(node.keys, node.payloads)
                continue
            if 0 < i <= len(node.keys):
                yield node.keys[i - 1], node.payloads[i - 1]
            if i < len(node.children):
                stack.append((ref, i + 1))
                stack.append((node.children[i], 0))

    def traverse(self) -> list[tuple[bytes, Any]]:
        return list(self.items())

    def validate(self) -> list[str]:
        """Every structural violation found, as ``"<path>: <problem>"`` strings."""
        problems: list[str] = []
        leaf_depths: set[int] = set()
        m, cmin = self.order, self.min_children

        def walk(ref, path, depth, lower, upper):
            node = self.node(ref)
            keys = node.keys
            n = len(keys)
            is_root = ref == self.root
            if any(a >= b for a, b in zip(keys, keys[1:])):
                problems.append(f"{path}: keys out of order")
            if len(node.payloads) != n:
                problems.append(f"{path}: {len(node.payloads)} payloads for {n} keys")
            if (lower is not None and keys and keys[0] <= lower) or (
                upper is not None and keys and keys[-1] >= upper
            ):
                problems.append(f"{path}: keys outside the parent separator range")
            if n > m - 1:
                problems.append(f"{path}: {n} keys exceeds maximum {m - 1}")
            if node.leaf:
                if node.children:
                    problems.append(f"{path}: leaf has children")
                if not is_root and n < cmin - 1:
                    problems.append(f"{path}: leaf has {n} keys, minimum is {cmin - 1}")
                leaf_depths.add(depth)
                return
            nc = len(node.children)
            if nc != n + 1:
                problems.append(f"{path}: {nc} children for {n} keys")
            low = 2 if is_root else cmin
            if not low <= nc <= m:
                problems.append(f"{path}: {nc} children, allowed {low}..{m}")
            bounds = [lower, *keys, upper]
            last = len(bounds) - 1
            for i, child in enumerate(node.children):
                walk(child, f"{path}/{i}", depth + 1, bounds[min(i, last)], bounds[min(i + 1, last)])

        walk(self.root, "root", 0, None, None)
        if len(leaf_depths) > 1:
            problems.append(f"root: leaves at differing depths {sorted(leaf_depths)}")
        return problems
