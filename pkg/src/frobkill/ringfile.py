"""Ring files, tower files and canonical JSON.

Ring file: line-oriented ``key = value``; ``#`` starts a comment.

    p = 2
    vars = a, b, c, d
    ideal = a*d - b*c, b^3 - a^2*c, c^3 - b*d^2, b^2*d - a*c^2
    cech = a, d

``ideal`` may be repeated; its generators are concatenated.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

from .errors import ParseError
from .poly import PolyRing
from .tower import Presentation, RingTower

RING_KEYS = {"p", "vars", "ideal", "cech"}


def _split_list(value):
    depth = 0
    cur = []
    out = []
    for ch in value:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail:
        out.append(tail)
    return [x for x in out if x]


def _key_values(text, allowed):
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in allowed:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
        entries.append((key, value))
    return entries


def parse_ring(text):
    """Parse a ring file into a validated standard graded presentation."""
    fields = {"ideal": []}
    for key, value in _key_values(text, RING_KEYS):
        if key == "ideal":
            fields["ideal"].extend(_split_list(value))
        elif key in fields:
            raise ParseError(f"duplicate key {key!r}")
        else:
            fields[key] = value
    if "p" not in fields or "vars" not in fields:
        raise ParseError("ring file needs 'p' and 'vars'")
    try:
        p = int(fields["p"])
    except ValueError:
        raise ParseError(f"modulus {fields['p']!r} is not an integer") from None
    ring = PolyRing(p, _split_list(fields["vars"]))
    gens = []
    for s in fields["ideal"]:
        g = ring.parse(s)
        if not g.is_homogeneous():
            raise ParseError(f"inhomogeneous generator {s} (term degrees {g.degrees()})")
        gens.append(g)
    cech = None
    if "cech" in fields:
        cech = [ring.index(c) for c in _split_list(fields["cech"])]
    return Presentation(ring, gens, cech)


def serialize_ring(pres):
    ring = pres.ring
    lines = [
        f"p = {ring.p}",
        "vars = " + ", ".join(ring.names),
        "ideal = " + ", ".join(g.to_string() for g in pres.gens) if pres.gens else None,
        "cech = " + ", ".join(ring.names[i] for i in pres.cech),
    ]
    return "\n".join(x for x in lines if x is not None) + "\n"


def ring_hash(pres):
    return hashlib.sha256(serialize_ring(pres).encode()).hexdigest()


def read_ring(path):
    with open(path, encoding="utf-8") as fh:
        return parse_ring(fh.read())


# -- towers ------------------------------------------------------------------


def tower_to_json(T):
    return {
        "base_vars": list(T.base.ring.names),
        "levels": [[nm, rel.to_string()] for nm, rel in T.levels],
        "extras": [e.to_string() for e in T.extras],
        "rank_bound": T.rank_bound(),
    }


def tower_from_json(base, data):
    if list(data["base_vars"]) != list(base.ring.names):
        raise ParseError("tower base variables do not match the ring")
    names = [nm for nm, _ in data["levels"]]
    ring = base.ring.extend(names)
    levels = tuple((nm, ring.parse(rel)) for nm, rel in data["levels"])
    extras = tuple(ring.parse(e) for e in data["extras"])
    return RingTower(base, levels, extras)


def tower_to_text(T):
    """Tower in the ring-file idiom (base ring lines plus adjunctions)."""
    lines = serialize_ring(T.base).splitlines()
    for nm, rel in T.levels:
        lines.append(f"level = {nm} : {rel.to_string()}")
    for e in T.extras:
        lines.append(f"relation = {e.to_string()}")
    return "\n".join(lines) + "\n"


def parse_tower_text(text):
    base_lines, levels, extras = [], [], []
    for key, value in _key_values(text, RING_KEYS | {"level", "relation"}):
        if key == "level":
            nm, _, rel = value.partition(":")
            levels.append((nm.strip(), rel.strip()))
        elif key == "relation":
            extras.append(value)
        else:
            base_lines.append(f"{key} = {value}")
    base = parse_ring("\n".join(base_lines))
    ring = base.ring.extend([nm for nm, _ in levels])
    return RingTower(
        base,
        tuple((nm, ring.parse(rel)) for nm, rel in levels),
        tuple(ring.parse(e) for e in extras),
    )


# -- canonical JSON ----------------------------------------------------------


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def digest(obj):
    body = {k: v for k, v in obj.items() if k != "digest"}
    raw = json.dumps(body, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(raw.encode()).hexdigest()


def seal(obj):
    obj = dict(obj)
    obj["digest"] = digest(obj)
    return obj


def atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
