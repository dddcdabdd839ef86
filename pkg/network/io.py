"""geolip-net-v1 documents: parsing, validation and canonical serialization."""

import hashlib
import json
import logging
from pathlib import Path
from typing import List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, PositiveInt, ValidationError

from config import NET_FORMAT
from errors import NetworkFormatError, NonFiniteError
from network.models import DenseLayer, Network

logger = logging.getLogger(__name__)


# Pydantic models
class ActivationDocument(BaseModel):
    kind: Literal["relu", "leaky_relu", "generic"]
    slope_min: float = 0.0
    slope_max: float = 1.0


class LayerDocument(BaseModel):
    weights: List[List[float]]
    bias: Optional[List[float]] = None


class NetworkDocument(BaseModel):
    format: Literal["geolip-net-v1"]
    input_dim: PositiveInt
    activation: ActivationDocument = ActivationDocument(kind="relu")
    layers: List[LayerDocument]


def _describe(error: ValidationError) -> str:
    first = error.errors()[0]
    where = ".".join(str(part) for part in first.get("loc", ()))
    return f"{where}: {first.get('msg')}" if where else first.get("msg", str(error))


def document_to_network(doc: NetworkDocument) -> Network:
    """Build a validated Network from a parsed document"""
    if not doc.layers:
        raise NetworkFormatError("network must have at least one layer")
    layers = []
    for index, layer in enumerate(doc.layers):
        widths = {len(row) for row in layer.weights}
        if len(widths) > 1:
            raise NetworkFormatError(f"layer {index} has ragged weight rows")
        layers.append(DenseLayer(layer.weights, layer.bias))
    return Network(
        input_dim=doc.input_dim,
        layers=tuple(layers),
        slope_min=doc.activation.slope_min,
        slope_max=doc.activation.slope_max,
        activation=doc.activation.kind,
    )


def load_network(data: Union[bytes, str]) -> Network:
    """Parse a geolip-net-v1 document"""
    try:
        doc = NetworkDocument.model_validate_json(data)
    except ValidationError as e:
        raise NetworkFormatError(f"malformed {NET_FORMAT} document ({_describe(e)})") from e
    return document_to_network(doc)


def network_to_document(net: Network) -> dict:
    for index, layer in enumerate(net.layers):
        if not (np.all(np.isfinite(layer.weights)) and np.all(np.isfinite(layer.bias))):
            raise NonFiniteError(f"layer {index} contains a non-finite entry")
    return {
        "format": NET_FORMAT,
        "input_dim": net.input_dim,
        "activation": {
            "kind": net.activation,
            "slope_min": net.slope_min,
            "slope_max": net.slope_max,
        },
        "layers": [
            {"weights": layer.weights.tolist(), "bias": layer.bias.tolist()}
            for layer in net.layers
        ],
    }


def save_network(net: Network) -> bytes:
    """Canonical serialization; floats use the shortest round-trip repr"""
    try:
        text = json.dumps(network_to_document(net), allow_nan=False)
    except ValueError as e:
        raise NonFiniteError(str(e)) from e
    return text.encode("utf-8")


def read_network(path) -> Network:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise NetworkFormatError(f"cannot read network file {path}: {e}") from e
    net = load_network(data)
    logger.debug("loaded %s with dims %s", path, net.dims)
    return net


def write_network(net: Network, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(save_network(net))
    return path


def fingerprint(net: Network) -> dict:
    """Dims plus a content hash of the canonical serialization"""
    return {"dims": net.dims, "sha256": hashlib.sha256(save_network(net)).hexdigest()}
