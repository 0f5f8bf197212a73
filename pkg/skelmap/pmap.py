"""
skelmap.pmap
~~~~~~~~~~~~

Text format for maps:

    pmap
    darts 4
    twin 2 3 0 1
    next 1 2 0 3
    root 1
    holes 3
    marked -
    labels -
    end
"""

from .triangulation import Triangulation, MapError

def dumps(t):
    """Serialize a map to `.pmap` text."""
    lines = ['pmap', f'darts {len(t)}']

    lines.append(_line('twin', t.twin))
    lines.append(_line('next', t.nxt))
    lines.append(f'root {"-" if t.root is None else t.root}')
    lines.append(_line('holes', t.holes))
    lines.append(f'marked {"-" if t.marked is None else t.marked}')
    lines.append('labels -' if t.labels is None else _line('labels', t.labels))
    lines.append('end')

    return '\n'.join(lines) + '\n'

def loads(text):
    """Parse `.pmap` text into a map."""
    maps = list(_parse(text.splitlines()))

    if len(maps) != 1:
        raise MapError(f'expected one map, found {len(maps)}')

    return maps[0]

def dump_corpus(maps, file):
    for t in maps:
        file.write(dumps(t))

def load_corpus(file):
    return list(_parse(file.read().splitlines()))

def _line(key, values):
    return ' '.join([key, *(str(value) for value in values)])

def _parse(lines):
    fields = None

    for (number, line) in enumerate(lines, start=1):
        line = line.strip()

        if not line or line.startswith('#'):
            continue

        (key, _, rest) = line.partition(' ')

        if key == 'pmap':
            if fields is not None:
                raise MapError(f'line {number}: unterminated map')

            fields = {}
        elif key == 'end':
            if fields is None:
                raise MapError(f'line {number}: end without pmap')

            yield _build(fields)

            fields = None
        elif fields is None:
            raise MapError(f'line {number}: {key} outside a map')
        else:
            fields[key] = rest.split()

    if fields is not None:
        raise MapError('unterminated map')

def _build(fields):
    try:
        darts = int(fields['darts'][0])
        twin = [int(value) for value in fields.get('twin', [])]
        nxt = [int(value) for value in fields.get('next', [])]
        root = _optional(fields.get('root', ['-'])[0])
        holes = [int(value) for value in fields.get('holes', [])]
        marked = _optional(fields.get('marked', ['-'])[0])
        labels = fields.get('labels', ['-'])
    except (KeyError, IndexError, ValueError) as error:
        raise MapError(f'invalid map record: {error}') from error

    if len(twin) != darts or len(nxt) != darts:
        raise MapError(f'expected {darts} darts')

    labels = None if labels == ['-'] else [int(value) for value in labels]

    return Triangulation(twin, nxt, root=root, holes=holes, marked=marked, labels=labels)

def _optional(value):
    return None if value == '-' else int(value)
