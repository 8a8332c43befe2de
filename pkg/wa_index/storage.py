"""The STWA1 index container.

Layout, little-endian: magic, u32 version, u32 section count, one
(name, offset, length) record per section, then the section bodies in a
fixed order: `meta` (JSON), `text` (u32 symbols), `structures`.

`structures` is a tagged value stream. Lists of plain ints and bools, and
numpy arrays, are stored as packed arrays. Objects are restricted to classes
defined in the index packages; they are restored by setting attributes on a
bare instance, so reading a file never runs constructors or other code.
Containers and objects seen twice are written once and referenced by their
order of first appearance, which keeps shared structures shared and makes
the encoding of a loaded index identical to the file it came from.
"""
import importlib
import json
import logging
import struct
from pathlib import Path

import numpy as np

from stwa.exceptions import IndexFormatError, InvalidArgument

from .index import WaIndex

logger = logging.getLogger(__name__)

MAGIC = b'STWA1'
VERSION = 2
HEADER = struct.Struct('<5sII')
SECTION = struct.Struct('<16sQQ')
SECTIONS = ('meta', 'text', 'structures')

PACKAGES = frozenset({'strcore', 'bitvec', 'nested_pred', 'suffix_tree', 'tree_tools', 'long_retrieval', 'wa_index'})

NONE, TRUE, FALSE, INT, BIG, FLOAT, STR, BYTES = b'NTFIJDSB'
LIST, INTS, BOOLS, TUPLE, DICT, SET, ARRAY, OBJECT, REF = b'LAZUMEYOR'

I64 = struct.Struct('<q')
U32 = struct.Struct('<I')
U64 = struct.Struct('<Q')
F64 = struct.Struct('<d')
INT_RANGE = range(-2 ** 63, 2 ** 63)


def _is_word(x):
    return isinstance(x, (int, np.integer)) and not isinstance(x, (bool, np.bool_)) and int(x) in INT_RANGE


def class_name(cls):
    return f'{cls.__module__}.{cls.__qualname__}'


def resolve_class(name):
    module, _, qualname = name.rpartition('.')
    if module.split('.')[0] not in PACKAGES or not qualname.isidentifier():
        raise IndexFormatError(f'class {name} may not be stored in an index')
    try:
        cls = getattr(importlib.import_module(module), qualname)
    except (ImportError, AttributeError) as exc:
        raise IndexFormatError(f'unknown class {name}') from exc
    if not isinstance(cls, type) or cls.__module__ != module:
        raise IndexFormatError(f'{name} is not a class of the index packages')
    return cls


def slot_names(cls):
    names = []
    for klass in cls.__mro__:
        slots = klass.__dict__.get('__slots__', ())
        names.extend([slots] if isinstance(slots, str) else slots)
    return names


class Encoder:
    def __init__(self, shared=()):
        self.out = bytearray()
        self.seen = {}
        self.keep = []
        for value in shared:
            self._remember(value)

    def _remember(self, value):
        self.seen[id(value)] = len(self.seen)
        self.keep.append(value)

    def _str(self, text):
        data = text.encode()
        self.out += U32.pack(len(data)) + data

    def encode(self, value):
        out = self.out
        if value is None:
            out.append(NONE)
        elif isinstance(value, (bool, np.bool_)):
            out.append(TRUE if value else FALSE)
        elif isinstance(value, (int, np.integer)):
            value = int(value)
            if value in INT_RANGE:
                out.append(INT)
                out += I64.pack(value)
            else:
                data = value.to_bytes((value.bit_length() + 8) // 8, 'little', signed=True)
                out.append(BIG)
                out += U32.pack(len(data)) + data
        elif isinstance(value, (float, np.floating)):
            out.append(FLOAT)
            out += F64.pack(float(value))
        elif isinstance(value, str):
            out.append(STR)
            self._str(value)
        elif isinstance(value, bytes):
            out.append(BYTES)
            out += U32.pack(len(value)) + value
        elif isinstance(value, tuple):
            out.append(TUPLE)
            out += U32.pack(len(value))
            for item in value:
                self.encode(item)
        elif id(value) in self.seen:
            out.append(REF)
            out += U32.pack(self.seen[id(value)])
        else:
            self._remember(value)
            self._encode_shared(value)

    def _encode_shared(self, value):
        out = self.out
        if isinstance(value, list):
            if value and all(isinstance(x, (bool, np.bool_)) for x in value):
                out.append(BOOLS)
                out += U32.pack(len(value)) + np.asarray(value, dtype='u1').tobytes()
            elif value and all(_is_word(x) for x in value):
                out.append(INTS)
                out += U32.pack(len(value)) + np.asarray(value, dtype='<i8').tobytes()
            else:
                out.append(LIST)
                out += U32.pack(len(value))
                for item in value:
                    self.encode(item)
        elif isinstance(value, dict):
            out.append(DICT)
            out += U32.pack(len(value))
            for key, item in value.items():
                self.encode(key)
                self.encode(item)
        elif isinstance(value, set):
            out.append(SET)
            out += U32.pack(len(value))
            for item in sorted(value):
                self.encode(item)
        elif isinstance(value, np.ndarray):
            array = np.ascontiguousarray(value, dtype=value.dtype.newbyteorder('<'))
            out.append(ARRAY)
            self._str(array.dtype.str)
            out += U32.pack(array.ndim)
            for dim in array.shape:
                out += U64.pack(dim)
            data = array.tobytes()
            out += U64.pack(len(data)) + data
        elif type(value).__module__.split('.')[0] in PACKAGES:
            cls = type(value)
            if hasattr(value, '__dict__'):
                state = list(vars(value).items())
            else:
                state = [(name, getattr(value, name)) for name in slot_names(cls) if hasattr(value, name)]
            out.append(OBJECT)
            self._str(class_name(cls))
            out += U32.pack(len(state))
            for name, item in state:
                self._str(name)
                self.encode(item)
        else:
            raise InvalidArgument(f'cannot store a {type(value).__name__} in an index')


class Decoder:
    def __init__(self, data, shared=()):
        self.data = memoryview(data)
        self.at = 0
        self.seen = list(shared)

    def _take(self, size):
        if self.at + size > len(self.data):
            raise IndexFormatError('structures section is truncated')
        chunk = self.data[self.at:self.at + size]
        self.at += size
        return chunk

    def _unpack(self, fmt):
        return fmt.unpack(self._take(fmt.size))[0]

    def _str(self):
        try:
            return bytes(self._take(self._unpack(U32))).decode()
        except UnicodeDecodeError as exc:
            raise IndexFormatError('bad text in structures section') from exc

    def _reserve(self):
        self.seen.append(None)
        return len(self.seen) - 1

    def decode(self):
        tag = self._take(1)[0]
        if tag == NONE:
            return None
        if tag == TRUE:
            return True
        if tag == FALSE:
            return False
        if tag == INT:
            return self._unpack(I64)
        if tag == BIG:
            return int.from_bytes(self._take(self._unpack(U32)), 'little', signed=True)
        if tag == FLOAT:
            return self._unpack(F64)
        if tag == STR:
            return self._str()
        if tag == BYTES:
            return bytes(self._take(self._unpack(U32)))
        if tag == TUPLE:
            return tuple(self.decode() for _ in range(self._unpack(U32)))
        if tag == REF:
            ref = self._unpack(U32)
            if ref >= len(self.seen) or self.seen[ref] is None:
                raise IndexFormatError(f'dangling reference {ref}')
            return self.seen[ref]
        return self._decode_shared(tag)

    def _decode_shared(self, tag):
        slot = self._reserve()
        if tag in (INTS, BOOLS):
            count = self._unpack(U32)
            dtype, width = ('<i8', 8) if tag == INTS else ('u1', 1)
            value = np.frombuffer(self._take(count * width), dtype=dtype).tolist()
            if tag == BOOLS:
                value = [bool(x) for x in value]
            self.seen[slot] = value
        elif tag == LIST:
            value = self.seen[slot] = []
            value.extend(self.decode() for _ in range(self._unpack(U32)))
        elif tag == DICT:
            value = self.seen[slot] = {}
            for _ in range(self._unpack(U32)):
                key = self.decode()
                value[key] = self.decode()
        elif tag == SET:
            value = self.seen[slot] = set()
            value.update(self.decode() for _ in range(self._unpack(U32)))
        elif tag == ARRAY:
            try:
                dtype = np.dtype(self._str())
            except TypeError as exc:
                raise IndexFormatError('bad array type') from exc
            if dtype.hasobject:
                raise IndexFormatError('object arrays may not be stored in an index')
            shape = tuple(self._unpack(U64) for _ in range(self._unpack(U32)))
            data = self._take(self._unpack(U64))
            try:
                value = np.frombuffer(data, dtype=dtype).reshape(shape).copy()
            except ValueError as exc:
                raise IndexFormatError(f'array section does not fit shape {shape}') from exc
            self.seen[slot] = value
        elif tag == OBJECT:
            cls = resolve_class(self._str())
            value = self.seen[slot] = cls.__new__(cls)
            for _ in range(self._unpack(U32)):
                name = self._str()
                object.__setattr__(value, name, self.decode())
        else:
            raise IndexFormatError(f'unknown value tag {tag!r}')
        return value


def dump_index(index):
    meta = {'version': VERSION, 'mode': index.mode, 'text_length': index.n,
            'instances': [list(key) for key in sorted(index.slots)]}
    state = {name: value for name, value in vars(index).items() if name != 'text'}
    encoder = Encoder(shared=[index.text])
    encoder.encode(state)
    bodies = {
        'meta': json.dumps(meta, sort_keys=True).encode(),
        'text': np.asarray(index.text, dtype='<u4').tobytes(),
        'structures': bytes(encoder.out),
    }
    offset = HEADER.size + SECTION.size * len(SECTIONS)
    records = []
    for name in SECTIONS:
        records.append(SECTION.pack(name.encode(), offset, len(bodies[name])))
        offset += len(bodies[name])
    return b''.join([HEADER.pack(MAGIC, VERSION, len(SECTIONS)), *records, *(bodies[name] for name in SECTIONS)])


def parse_index(data):
    if len(data) < HEADER.size:
        raise IndexFormatError('index file is truncated')
    magic, version, count = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise IndexFormatError('not an index file')
    if version != VERSION:
        raise IndexFormatError(f'unsupported index version {version}')
    sections = {}
    for s in range(count):
        at = HEADER.size + s * SECTION.size
        if at + SECTION.size > len(data):
            raise IndexFormatError('section table is truncated')
        name, offset, length = SECTION.unpack_from(data, at)
        if offset + length > len(data):
            raise IndexFormatError(f'section {name.rstrip(bytes(1)).decode()} runs past the end of the file')
        sections[name.rstrip(bytes(1)).decode()] = data[offset:offset + length]
    missing = set(SECTIONS) - set(sections)
    if missing:
        raise IndexFormatError(f'missing sections: {", ".join(sorted(missing))}')

    meta = json.loads(sections['meta'])
    text = np.frombuffer(sections['text'], dtype='<u4').tolist()
    if meta.get('text_length') != len(text):
        raise IndexFormatError('text section does not match the recorded length')
    decoder = Decoder(sections['structures'], shared=[text])
    state = decoder.decode()
    if not isinstance(state, dict) or decoder.at != len(decoder.data):
        raise IndexFormatError('structures section is malformed')
    index = WaIndex.__new__(WaIndex)
    for name, value in state.items():
        setattr(index, name, value)
    index.text = text
    return index


def save_index(index, path):
    data = dump_index(index)
    Path(path).write_bytes(data)
    logger.info('saved %s index (%d symbols) to %s, %d bytes', index.mode, index.n, path, len(data))
    return len(data)


def load_index(path):
    index = parse_index(Path(path).read_bytes())
    logger.info('loaded %s index (%d symbols) from %s', index.mode, index.n, path)
    return index
