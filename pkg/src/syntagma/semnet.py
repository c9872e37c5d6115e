"""A small semantic network for disambiguation.

File format::

    NODE Paris
      TAG populated-place
      REL hypernym city
    NODE graduate
      REL compatible-with discipline 0.9 in

``REL <kind> <target> [weight] [label]``.  Hypernym and meronym targets
must be nodes; a compatible-with target may be a node or a tag, and its
label names the relation it licenses (a connective or a function, ``*``
for any).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

RELATION_KINDS = ("hypernym", "meronym", "compatible-with")
SHARED_TAG_SCORE = 0.9
DECAY = 0.8
COORDINATION_THRESHOLD = 0.5


class SemNetError(ValueError):
    pass


@dataclass(frozen=True)
class Relation:
    kind: str
    target: str
    weight: float = 1.0
    label: str = "*"


@dataclass(frozen=True)
class SemNode:
    id: str
    tags: frozenset = frozenset()
    relations: tuple = ()

    def related(self, kind: str) -> list[Relation]:
        return [r for r in self.relations if r.kind == kind]


@dataclass
class SemNet:
    nodes: dict = field(default_factory=dict)

    def __contains__(self, node_id) -> bool:
        return node_id in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def tags(self, node_id: str) -> frozenset:
        node = self.nodes.get(node_id)
        return node.tags if node else frozenset()

    def ancestors(self, node_id: str) -> dict[str, int]:
        """Hypernym ancestors with their shortest distance (self at 0)."""
        dist = {node_id: 0}
        queue = deque([node_id])
        while queue:
            cur = queue.popleft()
            for rel in self.nodes[cur].related("hypernym"):
                if rel.target not in dist:
                    dist[rel.target] = dist[cur] + 1
                    queue.append(rel.target)
        return dist

    def similarity(self, a: str, b: str) -> Optional[float]:
        """Score in [0, 1], or None when the network cannot tell."""
        if a not in self.nodes or b not in self.nodes:
            return None
        if a == b:
            return 1.0
        best = None
        if self.tags(a) & self.tags(b):
            best = SHARED_TAG_SCORE
        up_a, up_b = self.ancestors(a), self.ancestors(b)
        common = set(up_a) & set(up_b)
        if common:
            d = min(up_a[c] + up_b[c] for c in common)
            score = SHARED_TAG_SCORE * DECAY ** d
            best = score if best is None else max(best, score)
        return best

    def is_meronym_of(self, part: str, whole: str) -> bool:
        if part not in self.nodes:
            return False
        wholes = {r.target for r in self.nodes[part].related("meronym")}
        return any(w in wholes for w in self.ancestors(whole)) if whole in self.nodes else False

    def compatible(self, head: str, relation: str, dependent: str) -> Optional[float]:
        """Weight of a compatible-with edge from ``head`` covering ``dependent``.

        Edges reached through the dependent's hypernyms decay by 0.8 per level;
        the shallowest match wins.
        """
        if head not in self.nodes or dependent not in self.nodes:
            return None
        edges = [r for r in self.nodes[head].related("compatible-with")
                 if r.label in ("*", relation)]
        if not edges:
            return None
        by_level: dict[int, float] = {}
        for node, level in self.ancestors(dependent).items():
            names = {node} | self.tags(node)
            for e in edges:
                if e.target in names:
                    by_level[level] = max(by_level.get(level, 0.0), e.weight)
        if not by_level:
            return None
        level = min(by_level)
        return by_level[level] * DECAY ** level


def loads_semnet(text: str) -> SemNet:
    raw: dict[str, dict] = {}
    order: list[str] = []
    current = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        key = words[0]
        if key == "NODE":
            if len(words) != 2:
                raise SemNetError(f"line {lineno}: NODE needs one id")
            current = words[1]
            if current in raw:
                raise SemNetError(f"line {lineno}: duplicate node {current}")
            raw[current] = {"tags": set(), "rels": []}
            order.append(current)
        elif key in ("TAG", "REL") and current is None:
            raise SemNetError(f"line {lineno}: {key} outside a NODE block")
        elif key == "TAG":
            raw[current]["tags"].update(words[1:])
        elif key == "REL":
            if len(words) < 3 or words[1] not in RELATION_KINDS:
                raise SemNetError(f"line {lineno}: expected REL <kind> <target> [weight] [label]")
            try:
                weight = float(words[3]) if len(words) > 3 else 1.0
            except ValueError:
                raise SemNetError(f"line {lineno}: bad weight {words[3]!r}") from None
            label = words[4] if len(words) > 4 else "*"
            raw[current]["rels"].append((Relation(words[1], words[2], weight, label), lineno))
        else:
            raise SemNetError(f"line {lineno}: unknown directive {key!r}")

    all_tags = set().union(*(r["tags"] for r in raw.values())) if raw else set()
    nodes = {}
    for node_id in order:
        rels = []
        for rel, lineno in raw[node_id]["rels"]:
            ok = rel.target in raw or (rel.kind == "compatible-with" and rel.target in all_tags)
            if not ok:
                raise SemNetError(f"line {lineno}: dangling target {rel.target!r} of {node_id}")
            rels.append(rel)
        nodes[node_id] = SemNode(node_id, frozenset(raw[node_id]["tags"]), tuple(rels))
    net = SemNet(nodes)
    _check_acyclic(net)
    return net


def _check_acyclic(net: SemNet) -> None:
    state: dict[str, int] = {}

    def visit(n: str, path: list[str]):
        state[n] = 1
        for rel in net.nodes[n].related("hypernym"):
            t = rel.target
            if state.get(t) == 1:
                cycle = path[path.index(t):] + [t] if t in path else [n, t]
                raise SemNetError("hypernym cycle: " + " -> ".join(cycle))
            if t not in state:
                visit(t, path + [t])
        state[n] = 2

    for n in net.nodes:
        if n not in state:
            visit(n, [n])


def load_semnet(path) -> SemNet:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SemNetError(f"{path}: cannot read semantic network: {exc.strerror or exc}") from exc
    try:
        return loads_semnet(text)
    except SemNetError as exc:
        raise SemNetError(f"{path}: {exc}") from None


def load_pairs(path) -> dict:
    """Word-couplet weights: ``{(head, connective, dependent): weight}``."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SemNetError(f"{path}: cannot read pair list: {exc.strerror or exc}") from exc
    return loads_pairs(text)


def loads_pairs(text: str) -> dict:
    pairs = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.rstrip("\n").split("\t")
        if len(cols) != 4:
            raise SemNetError(f"pairs line {lineno}: expected 4 tab-separated columns")
        head, conn, dep, weight = cols
        try:
            pairs[(head, None if conn == "-" else conn, dep)] = float(weight)
        except ValueError:
            raise SemNetError(f"pairs line {lineno}: bad weight {weight!r}") from None
    return pairs
