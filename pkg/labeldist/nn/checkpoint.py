import numpy as np

from labeldist.errors import InputError
from labeldist.nn.model import Head, MlpModel

MAGIC = b"LDMLP1"
HEAD_TAGS = {Head.SOFTMAX: 0, Head.SIGMOID: 1}


def save_checkpoint(model: MlpModel, path) -> None:
    """LDMLP1, dims (in, hidden, out) as u64, head tag u8, then w1 b1 w2 b2 as row-major f64."""
    in_dim, hidden = model.w1.shape
    out_dim = model.w2.shape[1]
    if model.w2.shape[0] != hidden:
        raise InputError("only plain MLP checkpoints are supported")
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(np.array([in_dim, hidden, out_dim], dtype="<u8").tobytes())
        f.write(np.array([HEAD_TAGS[model.head]], dtype="u1").tobytes())
        for array in (model.w1, model.b1, model.w2, model.b2):
            f.write(np.ascontiguousarray(array, dtype="<f8").tobytes())


def load_checkpoint(path) -> MlpModel:
    with open(path, "rb") as f:
        payload = f.read()
    if not payload.startswith(MAGIC):
        raise InputError(f"{path} is not an LDMLP1 checkpoint")
    offset = len(MAGIC)

    def take(dtype: str, count: int) -> np.ndarray:
        nonlocal offset
        width = np.dtype(dtype).itemsize * count
        if offset + width > len(payload):
            raise InputError(f"{path} is truncated")
        chunk = np.frombuffer(payload, dtype=dtype, count=count, offset=offset)
        offset += width
        return chunk

    in_dim, hidden, out_dim = (int(v) for v in take("<u8", 3))
    tag = int(take("u1", 1)[0])
    heads = {value: key for key, value in HEAD_TAGS.items()}
    if tag not in heads:
        raise InputError(f"{path} has unknown head tag {tag}")

    arrays = []
    for shape in ((in_dim, hidden), (hidden,), (hidden, out_dim), (out_dim,)):
        arrays.append(take("<f8", int(np.prod(shape))).reshape(shape).copy())
    return MlpModel(*arrays, head=heads[tag])
