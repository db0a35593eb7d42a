"""JSON interchange formats for matrices, effects, states, observables,
instruments, and measurement models.

A matrix document has an integer ``dim`` and a row-major ``entries`` list of
[re, im] pairs. Writers emit full double precision; readers accept whatever
precision is present.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .effects import Effect, make_effect
from .errors import ParseError
from .instruments import AdditivityWitness, Instrument, make_instrument, make_operation
from .linalg import DEFAULT_TOL, Tolerance
from .models import MeasurementModel, make_measurement_model
from .observables import Observable, make_observable
from .states import State, make_state


def matrix_to_obj(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "dim": int(m.shape[0]),
        "entries": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }


def matrix_from_obj(obj: Any) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        entries = obj["entries"]
        if dim < 1 or len(entries) != dim * dim:
            raise ParseError(f"matrix needs {dim * dim} entries, got {len(entries)}")
        flat = np.array([complex(float(re), float(im)) for re, im in entries])
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed matrix document: {exc}") from exc
    return flat.reshape(dim, dim)


def effect_to_obj(effect: Effect, label: str | None = None) -> dict:
    obj = matrix_to_obj(effect.matrix)
    if label is not None:
        obj["label"] = str(label)
    return obj


def effect_from_obj(obj: Any, tol: Tolerance = DEFAULT_TOL) -> tuple[Effect, str | None]:
    label = obj.get("label") if isinstance(obj, dict) else None
    return make_effect(matrix_from_obj(obj), tol), label


def state_to_obj(state: State) -> dict:
    return matrix_to_obj(state.matrix)


def state_from_obj(obj: Any, tol: Tolerance = DEFAULT_TOL) -> State:
    if isinstance(obj, dict) and "bloch" in obj:
        from .qubit import bloch_state

        try:
            r = [float(x) for x in obj["bloch"]]
        except (TypeError, ValueError) as exc:
            raise ParseError(f"malformed bloch vector: {exc}") from exc
        if len(r) != 3:
            raise ParseError(f"bloch vector needs 3 components, got {len(r)}")
        return bloch_state(r, tol)
    return make_state(matrix_from_obj(obj), tol)


def observable_to_obj(obs: Observable) -> dict:
    return {
        "labels": list(obs.labels),
        "effects": [matrix_to_obj(e.matrix) for e in obs.effects],
    }


def observable_from_obj(obj: Any, tol: Tolerance = DEFAULT_TOL) -> Observable:
    try:
        labels = [str(x) for x in obj["labels"]]
        effects = [make_effect(matrix_from_obj(e), tol) for e in obj["effects"]]
    except ParseError:
        raise
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed observable document: {exc}") from exc
    return make_observable(labels, effects, tol)


def instrument_to_obj(inst: Instrument) -> dict:
    return {
        "labels": list(inst.labels),
        "kraus": [[matrix_to_obj(k) for k in op.kraus] for op in inst.operations],
    }


def instrument_from_obj(obj: Any, tol: Tolerance = DEFAULT_TOL) -> Instrument:
    try:
        labels = [str(x) for x in obj["labels"]]
        ops = [
            make_operation([matrix_from_obj(k) for k in group], tol)
            for group in obj["kraus"]
        ]
    except ParseError:
        raise
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed instrument document: {exc}") from exc
    return make_instrument(labels, ops, tol)


def model_to_obj(model: MeasurementModel) -> dict:
    return {
        "dimH": model.dim_base,
        "dimK": model.dim_probe,
        "eta": matrix_to_obj(model.probe_state.matrix),
        "unitary": matrix_to_obj(model.unitary),
        "pointer": observable_to_obj(model.pointer),
    }


def model_from_obj(obj: Any, tol: Tolerance = DEFAULT_TOL) -> MeasurementModel:
    try:
        dim_base = int(obj["dimH"])
        dim_probe = int(obj["dimK"])
        eta = make_state(matrix_from_obj(obj["eta"]), tol)
        unitary = matrix_from_obj(obj["unitary"])
        pointer = observable_from_obj(obj["pointer"], tol)
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed model document: {exc}") from exc
    return make_measurement_model(dim_base, dim_probe, eta, unitary, pointer, tol)


def witness_to_obj(witness: AdditivityWitness, seed: int, restarts: int) -> dict:
    return {
        "seed": int(seed),
        "restarts": int(restarts),
        "restart_index": witness.restart_index,
        "gap": witness.gap,
        "state": state_to_obj(witness.state),
        "obs_a": observable_to_obj(witness.obs_a),
        "x1": list(witness.x1),
        "x2": list(witness.x2),
        "obs_b": observable_to_obj(witness.obs_b),
        "y": list(witness.y),
    }


def witness_from_obj(obj: Any, tol: Tolerance = DEFAULT_TOL) -> AdditivityWitness:
    try:
        return AdditivityWitness(
            state=state_from_obj(obj["state"], tol),
            obs_a=observable_from_obj(obj["obs_a"], tol),
            x1=tuple(obj["x1"]),
            x2=tuple(obj["x2"]),
            obs_b=observable_from_obj(obj["obs_b"], tol),
            y=tuple(obj["y"]),
            gap=float(obj["gap"]),
            restart_index=int(obj["restart_index"]),
        )
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed witness document: {exc}") from exc


def dump_json(obj: Any, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def dumps_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read JSON from {path}: {exc}") from exc
