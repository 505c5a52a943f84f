import csv

import pytest

USEFUL_COMMENTS = [
    "returns the byte count written so far",
    "validates the input buffer before the copy",
    "tracks the open handles per worker",
    "clamps the index to the array bounds",
    "guards the shared queue with a spin lock",
    "resets the parser state between requests",
]

NOISE_COMMENTS = [
    "todo fix this later",
    "old stuff kept around",
    "temporary hack do not touch",
    "wip misc cleanup",
    "xxx magic numbers here",
    "tbd copied from somewhere",
]


def write_shared_csv(path, n_rows=48, include_code=True, include_labels=True):
    """Deterministic corpus in the shared CSV contract, no package imports."""
    header = ["comment"]
    if include_code:
        header.append("code")
    if include_labels:
        header.append("label")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(n_rows):
            useful = i % 2 == 1
            pool = USEFUL_COMMENTS if useful else NOISE_COMMENTS
            row = [pool[i % len(pool)]]
            if include_code:
                row.append("" if i % 7 == 0 else f"int v{i} = {i};")
            if include_labels:
                row.append("Useful" if useful else "Not Useful")
            writer.writerow(row)
    return path


@pytest.fixture(scope="session")
def train_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "train.csv"
    return write_shared_csv(path)


@pytest.fixture(scope="session")
def desk_checkpoint(tmp_path_factory, train_csv):
    """One desk-scale albert checkpoint shared by the whole session."""
    from commentclf_finetune import preset_config, run_finetune

    out = tmp_path_factory.mktemp("ckpt") / "albert-desk"
    config = preset_config("albert", desk_scale=True, seed=5)
    run_finetune(config, train_csv, out)
    return out
