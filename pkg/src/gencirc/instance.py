"""JSON instance documents and deterministic spectrum/report rendering."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .circulant import CirculantSpec
from .spectral import SpectralDecomposition


class ParseError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class InstanceDocument:
    m: int
    s: int
    u: np.ndarray
    coeffs: np.ndarray
    seed: int | None = None

    def __eq__(self, other):
        if not isinstance(other, InstanceDocument):
            return NotImplemented
        return (
            self.m == other.m
            and self.s == other.s
            and self.seed == other.seed
            and np.array_equal(self.u, other.u)
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def to_spec(self) -> CirculantSpec:
        return CirculantSpec.build(self.m, self.s, self.u, self.coeffs)

    def to_dict(self) -> dict:
        out = {"m": self.m, "s": self.s, "u": encode_vector(self.u), "coeffs": encode_vector(self.coeffs)}
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def _complex(item, where: str) -> complex:
    if not isinstance(item, (list, tuple)) or len(item) != 2:
        raise ParseError(f"{where}: expected [re, im], got {item!r}")
    parts = []
    for x in item:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise ParseError(f"{where}: non-numeric component {x!r}")
        if not math.isfinite(x):
            raise ParseError(f"{where}: non-finite component {x!r}")
        parts.append(float(x))
    return complex(parts[0], parts[1])


def _int(doc: dict, key: str) -> int:
    if key not in doc:
        raise ParseError(f"missing field {key!r}")
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"field {key!r} must be an integer, got {v!r}")
    return v


def from_dict(doc) -> InstanceDocument:
    if not isinstance(doc, dict):
        raise ParseError("instance must be a JSON object")
    m = _int(doc, "m")
    s = _int(doc, "s")
    if m < 1:
        raise ParseError(f"m must be positive, got {m}")
    if not 0 <= s < m:
        raise ParseError(f"s must lie in [0, {m}), got {s}")
    for key in ("u", "coeffs"):
        if not isinstance(doc.get(key), list):
            raise ParseError(f"field {key!r} must be a list of [re, im] pairs")
    u = np.array([_complex(x, f"u[{i}]") for i, x in enumerate(doc["u"])], dtype=complex)
    if u.size != m:
        raise ParseError(f"u has {u.size} entries, m = {m}")
    coeffs = np.array([_complex(x, f"coeffs[{i}]") for i, x in enumerate(doc["coeffs"])], dtype=complex)
    if coeffs.size == 0:
        raise ParseError("coeffs must not be empty")
    seed = doc.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise ParseError(f"seed must be an integer, got {seed!r}")
    return InstanceDocument(m, s, u, coeffs, seed)


def loads(text: str) -> InstanceDocument:
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return from_dict(doc)


def _reject_constant(name):
    raise ParseError(f"non-finite number {name} not allowed")


def encode_vector(values) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex)]


def spectrum_dict(decomp: SpectralDecomposition) -> dict:
    vecs = decomp.vectors
    records = []
    for i in range(len(decomp)):
        records.append(
            {
                "t": int(decomp.orbit_index[i]),
                "p": int(decomp.phase_index[i]),
                "eigenvalue": encode_vector([decomp.eigenvalues[i]])[0],
                "eigenvector": encode_vector(vecs[:, i]),
            }
        )
    out = {
        "case": decomp.case.value,
        "m": decomp.m,
        "omega": encode_vector([decomp.omega])[0],
        "pairs": records,
        "spectrum": encode_vector(decomp.spectrum),
    }
    if decomp.notes:
        out["notes"] = list(decomp.notes)
    return out


def decomposition_from_dict(doc: dict) -> SpectralDecomposition:
    """Rebuild a decomposition from a spectrum document (for re-verification)."""
    from .spectral import CaseTag

    try:
        pairs = doc["pairs"]
        m = int(doc["m"])
        vals = np.array([_complex(p["eigenvalue"], "eigenvalue") for p in pairs], dtype=complex)
        vecs = np.array(
            [[_complex(x, "eigenvector") for x in p["eigenvector"]] for p in pairs], dtype=complex
        ).reshape(len(pairs), m).T
        spectrum = np.array([_complex(x, "spectrum") for x in doc.get("spectrum", [])], dtype=complex)
        if spectrum.size == 0:
            spectrum = vals
        case = CaseTag(doc["case"])
        omega = _complex(doc["omega"], "omega")
        t = np.array([int(p["t"]) for p in pairs], dtype=int)
        ph = np.array([int(p["p"]) for p in pairs], dtype=int)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed spectrum document: {exc}") from None

    def columns(sel):
        return vecs[:, np.asarray(sel)]

    return SpectralDecomposition(case, m, omega, vals, t, ph, spectrum, columns)


def _format_float(x: float) -> str:
    if x == 0:
        return "0.0" if math.copysign(1.0, x) > 0 else "-0.0"
    text = format(x, ".17g")
    if not any(ch in text for ch in ".eE"):
        text += ".0"
    return text


def dumps(obj, indent: int = 2) -> str:
    """JSON with every float printed to 17 significant digits."""

    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {enc(v, level + 1)}" for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple)):
            if not o:
                return "[]"
            if all(not isinstance(x, (dict, list, tuple)) for x in o):
                return "[" + ", ".join(enc(x, level + 1) for x in o) + "]"
            return "[\n" + ",\n".join(pad + enc(x, level + 1) for x in o) + "\n" + end + "]"
        if isinstance(o, bool) or o is None:
            return json.dumps(o)
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            if not math.isfinite(o):
                return json.dumps(str(o))
            return _format_float(float(o))
        return json.dumps(o)

    return enc(obj, 0) + "\n"
