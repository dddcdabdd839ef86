import json

import pandas as pd

from config import DATA_DIR, DATA_PATHS
from network.generator import make_generator, random_network
from network.io import fingerprint, write_network
from network.models import DenseLayer, Network

CORPUS_SEED = 2023


def example_network() -> Network:
    """The 2-2-1 worked example: W = [[1, -1], [2, 0]], u = [1, 1]"""
    hidden = DenseLayer([[1.0, -1.0], [2.0, 0.0]], [0.0, 0.0])
    output = DenseLayer([[1.0, 1.0]], [0.0])
    return Network(2, (hidden, output))


def generate_two_layer_corpus(n_nets=50, seed=CORPUS_SEED):
    """Two-layer nets with input width 4-20 and hidden width 4-14"""
    rng = make_generator(seed)
    nets = []
    for i in range(n_nets):
        dims = [int(rng.integers(4, 21)), int(rng.integers(4, 15)), 1]
        nets.append((f"two_layer_{i:03d}", random_network(dims, seed=seed + i)))
    return nets


def generate_three_layer_corpus(n_nets=20, seed=CORPUS_SEED + 1, max_hidden=12):
    """Three-layer nets with at most `max_hidden` hidden units in total"""
    rng = make_generator(seed)
    nets = []
    for i in range(n_nets):
        first = int(rng.integers(2, max_hidden - 1))
        second = int(rng.integers(2, max_hidden - first + 1))
        dims = [int(rng.integers(3, 11)), first, second, 1]
        nets.append((f"three_layer_{i:03d}", random_network(dims, seed=seed + i)))
    return nets


def generate_sign_matrices(n_matrices=20, shape=(3, 3), seed=CORPUS_SEED + 2):
    """Random ±1 matrices for the cut-norm reduction"""
    rng = make_generator(seed)
    return [
        (f"signs_{i:03d}", rng.choice([-1.0, 1.0], size=shape))
        for i in range(n_matrices)
    ]


def manifest_rows(group, nets):
    rows = []
    for name, net in nets:
        info = fingerprint(net)
        rows.append({
            "name": name,
            "group": group,
            "dims": ",".join(str(d) for d in info["dims"]),
            "hidden_units": net.total_hidden_units,
            "sha256": info["sha256"],
        })
    return rows


def write_corpus():
    """Write every corpus under `root` and return the manifest"""
    rows = []

    print("Writing the 2-2-1 example...")
    example = example_network()
    write_network(example, DATA_PATHS["example"])
    rows.extend(manifest_rows("example", [("example_221", example)]))

    print("Generating two-layer corpus...")
    two_layer = generate_two_layer_corpus()
    for name, net in two_layer:
        write_network(net, DATA_PATHS["two_layer"] / f"{name}.json")
    rows.extend(manifest_rows("two_layer", two_layer))

    print("Generating three-layer corpus...")
    three_layer = generate_three_layer_corpus()
    for name, net in three_layer:
        write_network(net, DATA_PATHS["three_layer"] / f"{name}.json")
    rows.extend(manifest_rows("three_layer", three_layer))

    print("Generating sign matrices...")
    DATA_PATHS["sign_matrices"].mkdir(parents=True, exist_ok=True)
    matrices = generate_sign_matrices()
    for name, matrix in matrices:
        (DATA_PATHS["sign_matrices"] / f"{name}.json").write_text(json.dumps(matrix.tolist()))

    manifest = pd.DataFrame(rows, columns=["name", "group", "dims", "hidden_units", "sha256"])
    manifest.to_csv(DATA_PATHS["manifest"], index=False)
    return manifest, len(matrices)


if __name__ == "__main__":
    manifest, n_matrices = write_corpus()

    print("Corpus generation completed!")
    print(f"Wrote {len(manifest)} networks to {DATA_DIR}")
    print(manifest.groupby("group").size().to_string())
    print(f"Wrote {n_matrices} sign matrices")
