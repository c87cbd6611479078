"""Line-oriented network description files.

Example::

    # one Bell pair, Alice measures in the X basis
    qubits 2
    edge e vertices=0,1
    gens "+XX" "+ZZ"
    party A vertices=0 ancillas=0
    circuit H 0
    party B vertices=1 ancillas=0

A mixed source replaces the ``gens``/``prep`` line with a block::

    mixed
    component weight=1/2 gens "+XX" "+ZZ" label A=0 label B=0
    component weight=1/2 prep X 0;X 1 label A=1 label B=1
    end

``post <file>`` attaches a post-processing table (one ``raw reported`` pair
per line) resolved relative to the network file.
"""

from __future__ import annotations

import shlex
from fractions import Fraction
from pathlib import Path

from .distribution import format_fraction, parse_fraction
from .errors import ParseError, QnetError
from .network import Edge, MixedComponent, MixedSource, NetworkSpec, Party, PureSource
from .pauli import CliffordCircuit, PauliOperator


def _split(line, lineno):
    try:
        return shlex.split(line, comments=True)
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from None


def _keyvals(tokens, lineno, required, optional=()):
    out = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep or key not in (*required, *optional):
            raise ParseError(f"unexpected token {tok!r}", lineno)
        out[key] = val
    missing = [k for k in required if k not in out]
    if missing:
        raise ParseError(f"missing {', '.join(missing)}=", lineno)
    return out


def _int_list(text, lineno):
    if not text:
        return ()
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise ParseError(f"bad index list {text!r}", lineno) from None


def _literals(tokens, lineno):
    if not tokens:
        raise ParseError("gens needs at least one literal", lineno)
    try:
        for t in tokens:
            PauliOperator.from_label(t)
    except ParseError as exc:
        raise ParseError(str(exc), lineno) from None
    return tuple(tokens)


def _circuit(text, lineno):
    try:
        return CliffordCircuit.parse(text)
    except ParseError as exc:
        raise ParseError(str(exc), lineno) from None


def _rest(line, keyword):
    """Text after the leading keyword, comments stripped."""
    body = line.split("#", 1)[0].strip()
    return body[len(keyword):].strip()


def _component(line, lineno):
    body = _rest(line, "component")
    head, _, tail = body.partition(" ")
    if not head.startswith("weight="):
        raise ParseError("component needs weight=p/q first", lineno)
    try:
        weight = parse_fraction(head.removeprefix("weight="))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad weight {head!r}", lineno) from None
    # Split off the trailing label clauses.
    parts = tail.split(" label ")
    state, labels = parts[0].strip(), []
    for clause in parts[1:]:
        party, sep, symbols = clause.strip().partition("=")
        if not sep or not party or not symbols or " " in symbols:
            raise ParseError(f"bad label clause {clause.strip()!r}", lineno)
        labels.append((party, symbols))
    if state.startswith("label "):
        raise ParseError("component has no state", lineno)
    kind, _, arg = state.partition(" ")
    if kind == "gens":
        source = PureSource(generators=_literals(_split(arg, lineno), lineno))
    elif kind == "prep":
        source = PureSource(prep=_circuit(arg, lineno))
    else:
        raise ParseError("component state must be gens or prep", lineno)
    return MixedComponent(weight, source, tuple(labels))


def load_post_table(path) -> dict[str, str]:
    table = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        tokens = line.split("#", 1)[0].split()
        if not tokens:
            continue
        if len(tokens) != 2:
            raise ParseError(f"{path}: expected 'raw reported'", lineno)
        if tokens[0] in table:
            raise ParseError(f"{path}: duplicate entry {tokens[0]!r}", lineno)
        table[tokens[0]] = tokens[1]
    return table


def parses(text: str, base_dir=None) -> NetworkSpec:
    base = Path(base_dir) if base_dir is not None else Path(".")
    n = None
    edges, parties = [], []
    edge_head = None      # (name, vertices, lineno) awaiting its source
    mixed = None          # components of an open mixed block
    party_head = None     # dict of the party being assembled

    def close_party():
        nonlocal party_head
        if party_head is not None:
            parties.append(Party(**party_head))
            party_head = None

    lineno = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        tokens = _split(line, lineno)
        if not tokens:
            continue
        word = tokens[0]
        if mixed is not None:
            if word == "component":
                mixed.append(_component(line, lineno))
            elif word == "end":
                name, verts, _ = edge_head
                edges.append(Edge(name, verts, MixedSource(tuple(mixed))))
                edge_head = mixed = None
            else:
                raise ParseError(f"expected component or end, got {word!r}", lineno)
            continue
        if edge_head is not None and word not in ("gens", "prep", "mixed"):
            raise ParseError(f"edge {edge_head[0]} has no source", lineno)

        if word == "qubits":
            if n is not None:
                raise ParseError("qubits declared twice", lineno)
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise ParseError("expected 'qubits N'", lineno)
            n = int(tokens[1])
        elif n is None:
            raise ParseError("file must start with 'qubits N'", lineno)
        elif word == "edge":
            close_party()
            if len(tokens) < 2:
                raise ParseError("edge needs a name", lineno)
            kv = _keyvals(tokens[2:], lineno, ("vertices",))
            edge_head = (tokens[1], _int_list(kv["vertices"], lineno), lineno)
        elif word in ("gens", "prep", "mixed"):
            if edge_head is None:
                raise ParseError(f"{word} outside an edge", lineno)
            if word == "gens":
                name, verts, _ = edge_head
                edges.append(Edge(name, verts, PureSource(generators=_literals(tokens[1:], lineno))))
                edge_head = None
            elif word == "prep":
                name, verts, _ = edge_head
                edges.append(Edge(name, verts, PureSource(prep=_circuit(_rest(line, "prep"), lineno))))
                edge_head = None
            else:
                if len(tokens) != 1:
                    raise ParseError("mixed takes no arguments", lineno)
                mixed = []
        elif word == "party":
            close_party()
            if len(tokens) < 2:
                raise ParseError("party needs a name", lineno)
            kv = _keyvals(tokens[2:], lineno, ("vertices",), ("ancillas",))
            try:
                ancillas = int(kv.get("ancillas", "0"))
            except ValueError:
                raise ParseError(f"bad ancilla count {kv['ancillas']!r}", lineno) from None
            party_head = dict(name=tokens[1], vertices=_int_list(kv["vertices"], lineno), ancillas=ancillas)
        elif word == "circuit":
            if party_head is None:
                raise ParseError("circuit outside a party", lineno)
            if "circuit" in party_head:
                raise ParseError("party has two circuit lines", lineno)
            party_head["circuit"] = _circuit(_rest(line, "circuit"), lineno)
        elif word == "post":
            if party_head is None:
                raise ParseError("post outside a party", lineno)
            if len(tokens) != 2:
                raise ParseError("expected 'post FILE'", lineno)
            try:
                party_head["post"] = load_post_table(base / tokens[1])
            except OSError as exc:
                raise ParseError(f"cannot read post table: {exc}", lineno) from None
            party_head["post_file"] = tokens[1]
        else:
            raise ParseError(f"unknown directive {word!r}", lineno)

    if mixed is not None:
        raise ParseError(f"mixed block of edge {edge_head[0]} not closed with 'end'", lineno)
    if edge_head is not None:
        raise ParseError(f"edge {edge_head[0]} has no source", edge_head[2])
    if n is None:
        raise ParseError("empty network file", max(lineno, 1))
    close_party()
    return NetworkSpec(n, tuple(edges), tuple(parties))


def load(path) -> NetworkSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise QnetError(f"cannot read {path}: {exc}") from None
    return parses(text, path.parent)


def _gens_text(gens):
    return " ".join(f'"{g}"' for g in gens)


def _source_text(src: PureSource):
    if src.generators is not None:
        return f"gens {_gens_text(src.generators)}"
    return f"prep {src.prep}"


def dumps(spec: NetworkSpec, post_names=None) -> str:
    """Render ``spec``; ``post_names`` maps party name to the table file to reference."""
    post_names = post_names or {}
    lines = [f"qubits {spec.n}"]
    for e in spec.edges:
        lines.append(f"edge {e.name} vertices={','.join(map(str, e.vertices))}")
        if isinstance(e.source, PureSource):
            lines.append(_source_text(e.source))
            continue
        lines.append("mixed")
        for c in e.source.components:
            labels = "".join(f" label {p}={s}" for p, s in c.labels)
            lines.append(f"component weight={format_fraction(Fraction(c.weight))} {_source_text(c.source)}{labels}")
        lines.append("end")
    for p in spec.parties:
        lines.append(f"party {p.name} vertices={','.join(map(str, p.vertices))} ancillas={p.ancillas}")
        if len(p.circuit):
            lines.append(f"circuit {p.circuit}")
        if p.post is not None:
            name = post_names.get(p.name, p.post_file)
            if name is None:
                raise QnetError(f"party {p.name} has a post table but no file name")
            lines.append(f"post {name}")
    return "\n".join(lines) + "\n"


def dump_post_table(table) -> str:
    return "".join(f"{raw} {out}\n" for raw, out in sorted(dict(table).items()))


def save(spec: NetworkSpec, path) -> Path:
    """Write ``spec`` and any post tables (as ``<stem>.<party>.post`` when unnamed)."""
    path = Path(path)
    names = {}
    for p in spec.parties:
        if p.post is None:
            continue
        name = p.post_file or f"{path.stem}.{p.name}.post"
        names[p.name] = name
        (path.parent / name).write_text(dump_post_table(p.post), encoding="utf-8")
    path.write_text(dumps(spec, names), encoding="utf-8")
    return path
