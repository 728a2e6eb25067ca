"""

    IDX files (the MNIST container).

    Layout, all big-endian:
        0x00 0x00 <type code> <number of dimensions n>
        n x uint32 dimension sizes
        raw data, row-major

    read_idx scales unsigned-byte tensors with two or more dimensions (images) to [0, 1]
    and returns everything else as stored, labels as int64.

"""
import struct

import numpy as np

from ..errors import IdxFormatError

IDX_TYPES = {
    0x08: np.dtype('>u1'),
    0x09: np.dtype('>i1'),
    0x0B: np.dtype('>i2'),
    0x0C: np.dtype('>i4'),
    0x0D: np.dtype('>f4'),
    0x0E: np.dtype('>f8'),
}

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801


def parse_idx(raw: bytes, source: str = '<bytes>') -> np.ndarray:
    if len(raw) < 4:
        raise IdxFormatError('logic.read_idx: {} is truncated: no header'.format(source))
    zero, type_code, ndim = struct.unpack('>HBB', raw[:4])
    if zero != 0:
        raise IdxFormatError('logic.read_idx: {} has bad magic 0x{:08x}'.format(source, struct.unpack('>I', raw[:4])[0]))
    if type_code not in IDX_TYPES:
        raise IdxFormatError('logic.read_idx: {} has unsupported type code 0x{:02x}'.format(source, type_code))
    if ndim < 1:
        raise IdxFormatError('logic.read_idx: {} declares no dimensions'.format(source))

    header = 4 + 4 * ndim
    if len(raw) < header:
        raise IdxFormatError('logic.read_idx: {} is truncated inside the dimension sizes'.format(source))
    shape = struct.unpack('>{}I'.format(ndim), raw[4:header])

    dtype = IDX_TYPES[type_code]
    expected = int(np.prod(shape, dtype=np.int64)) * dtype.itemsize
    available = len(raw) - header
    if available < expected:
        raise IdxFormatError('logic.read_idx: {} is truncated: {} data bytes, expected {}'.format(
            source, available, expected))
    if available > expected:
        raise IdxFormatError('logic.read_idx: {} has {} trailing bytes'.format(source, available - expected))

    data = np.frombuffer(raw, dtype=dtype, count=expected // dtype.itemsize, offset=header).reshape(shape)
    if type_code == 0x08 and ndim >= 2:
        return data.astype(np.float64) / 255.0
    if dtype.kind in 'iu':
        return data.astype(np.int64)
    return data.astype(np.float64)


def read_idx(path) -> np.ndarray:
    with open(path, 'rb') as f:
        return parse_idx(f.read(), source=str(path))


def write_idx(path, array, type_code: int = None):
    """Write array as stored (no scaling). type_code defaults from the dtype."""
    array = np.asarray(array)
    if type_code is None:
        matches = [code for code, dtype in IDX_TYPES.items() if dtype.newbyteorder('=') == array.dtype.newbyteorder('=')]
        if not matches:
            raise IdxFormatError('logic.write_idx: no IDX type code for dtype {}'.format(array.dtype))
        type_code = matches[0]
    if type_code not in IDX_TYPES:
        raise IdxFormatError('logic.write_idx: unsupported type code 0x{:02x}'.format(type_code))
    if array.ndim < 1 or array.ndim > 255:
        raise IdxFormatError('logic.write_idx: cannot store a {}-D array'.format(array.ndim))

    header = struct.pack('>HBB', 0, type_code, array.ndim) + struct.pack('>{}I'.format(array.ndim), *array.shape)
    with open(path, 'wb') as f:
        f.write(header)
        f.write(np.ascontiguousarray(array, dtype=IDX_TYPES[type_code]).tobytes())
