"""Input parsing and deterministic report serialization."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .distribution import InputSpec, JointPmf
from .errors import InputError

SCHEMA_VERSION = "1.0"


def parse_input(doc: dict) -> tuple[JointPmf, np.ndarray]:
    """Distribution and full-grid model table from a parsed input document."""
    try:
        inputs = tuple(InputSpec(str(s["name"]), tuple(s["levels"])) for s in doc["inputs"])
        pmf_doc = doc["pmf"]
        kind = pmf_doc["kind"]
        if kind == "dense":
            pmf = JointPmf(inputs, np.asarray(pmf_doc["values"], dtype=float))
        elif kind == "sparse":
            pmf = JointPmf.from_sparse(inputs, ((c["cell"], c["p"]) for c in pmf_doc["cells"]))
        else:
            raise InputError(f"unknown pmf kind {kind!r}")
        model = np.asarray(doc["model"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed input document: {exc!r}") from exc
    if model.size != pmf.weights.size:
        raise InputError(f"model has {model.size} values, grid has {pmf.weights.size} cells")
    if not np.all(np.isfinite(model)):
        raise InputError("model values must be finite")
    return pmf, model.reshape(pmf.shape)


def load_input(path) -> tuple[JointPmf, np.ndarray]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read input {path}: {exc}") from exc
    return parse_input(doc)


def input_document(pmf: JointPmf, model, sparse: bool = False) -> dict:
    inputs = [{"name": s.name, "levels": list(s.levels)} for s in pmf.inputs]
    if sparse:
        cells = [{"cell": [int(i) for i in idx], "p": float(pmf.weights[idx])}
                 for idx in zip(*np.nonzero(pmf.weights))]
        pmf_doc = {"kind": "sparse", "cells": cells}
    else:
        pmf_doc = {"kind": "dense", "values": [float(v) for v in pmf.weights.reshape(-1)]}
    return {"inputs": inputs, "pmf": pmf_doc, "model": [float(v) for v in np.asarray(model).reshape(-1)]}


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    if x == 0.0:
        return "0.0"  # folds -0.0 too
    text = format(x, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float at 17 significant digits; key order is preserved."""

    def enc(o, level: int) -> str:
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, bool) or o is None:
            return json.dumps(o)
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            return format_float(o)
        if isinstance(o, str):
            return json.dumps(o, ensure_ascii=False)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {enc(v, level + 1)}" for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple, np.ndarray)):
            seq = list(o)
            if not seq:
                return "[]"
            if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
                return "[" + ", ".join(enc(v, level + 1) for v in seq) + "]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in seq) + "\n" + end + "]"
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return enc(obj, 0) + "\n"
