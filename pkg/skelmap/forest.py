"""
skelmap.forest
~~~~~~~~~~~~~~
"""

from functools import cached_property
from itertools import accumulate
from more_itertools import split_after

class ForestError(ValueError):
    """Invalid child count sequence."""

class PlaneForest:
    """An ordered forest of plane trees.

    Each tree is its depth-first (preorder) sequence of child counts. Vertices
    are numbered in preorder across the trees, tree after tree; generations
    list the vertices left to right.
    """

    def __init__(self, trees):
        self.trees = tuple(tuple(int(c) for c in tree) for tree in trees)

        for (index, tree) in enumerate(self.trees):
            if not is_lukasiewicz(tree):
                raise ForestError(f'tree {index} is not a valid child count sequence: {list(tree)}')

    @classmethod
    def empty(cls):
        return cls(())

    @classmethod
    def from_levels(cls, levels):
        """Forest from its generations of child counts, left to right.

        `levels[0]` holds the roots; the children of generation g are the
        consecutive blocks of generation g+1.
        """
        levels = [list(level) for level in levels]

        for (g, level) in enumerate(levels):
            expected = sum(level)
            actual = len(levels[g + 1]) if g + 1 < len(levels) else 0

            if expected != actual:
                raise ForestError(f'generation {g} has {expected} children, '
                                  f'generation {g + 1} has {actual} vertices')

        # children[g][k] = indices into generation g+1
        children = []

        for (g, level) in enumerate(levels):
            starts = [0, *accumulate(level)]

            children.append([range(starts[k], starts[k + 1]) for k in range(len(level))])

        trees = []

        for root in range(len(levels[0]) if levels else 0):
            tree = []
            stack = [(0, root)]

            while stack:
                (g, k) = stack.pop()

                tree.append(levels[g][k])

                stack.extend((g + 1, child) for child in reversed(children[g][k]))

            trees.append(tree)

        return cls(trees)

    def __len__(self):
        return len(self.child_counts)

    def __eq__(self, other):
        return isinstance(other, PlaneForest) and self.trees == other.trees

    def __hash__(self):
        return hash(self.trees)

    def __repr__(self):
        return f'<PlaneForest trees={len(self.trees)} vertices={len(self)} height={self.height}>'

    @cached_property
    def child_counts(self):
        return tuple(c for tree in self.trees for c in tree)

    @cached_property
    def tree_starts(self):
        return tuple(accumulate((len(tree) for tree in self.trees), initial=0))

    @cached_property
    def _structure(self):
        parent = [None] * len(self)
        depth = [0] * len(self)
        tree_of = [0] * len(self)
        children = [[] for _ in range(len(self))]

        for (index, start) in enumerate(self.tree_starts[:-1]):
            stack = []

            for vertex in range(start, self.tree_starts[index + 1]):
                tree_of[vertex] = index

                if stack:
                    (above, remaining) = stack[-1]

                    parent[vertex] = above
                    depth[vertex] = depth[above] + 1
                    children[above].append(vertex)

                    if remaining == 1:
                        stack.pop()
                    else:
                        stack[-1] = (above, remaining - 1)

                if self.child_counts[vertex]:
                    stack.append((vertex, self.child_counts[vertex]))

        return (tuple(parent), tuple(depth), tuple(tree_of), tuple(tuple(c) for c in children))

    def parent(self, vertex):
        return self._structure[0][vertex]

    def depth(self, vertex):
        """Generation of a vertex, roots at 0."""
        return self._structure[1][vertex]

    def tree_of(self, vertex):
        return self._structure[2][vertex]

    def children(self, vertex):
        return self._structure[3][vertex]

    def rank(self, vertex):
        """Preorder rank of a vertex within its tree."""
        return vertex - self.tree_starts[self.tree_of(vertex)]

    def vertex(self, tree, rank):
        if not 0 <= tree < len(self.trees) or not 0 <= rank < len(self.trees[tree]):
            raise ForestError(f'no vertex ({tree}, {rank})')

        return self.tree_starts[tree] + rank

    @cached_property
    def generations(self):
        """Vertex ids per generation, left to right."""
        generations = []
        current = [self.tree_starts[index] for index in range(len(self.trees))]

        while current:
            generations.append(tuple(current))
            current = [child for vertex in current for child in self.children(vertex)]

        return tuple(generations)

    def generation(self, g):
        return self.generations[g] if 0 <= g < len(self.generations) else ()

    def levels(self):
        """Child counts per generation, the inverse of `from_levels`."""
        return [[self.child_counts[vertex] for vertex in generation] for generation in self.generations]

    def bfs_order(self):
        return [vertex for generation in self.generations for vertex in generation]

    @property
    def height(self):
        """Maximal generation, -1 for the empty forest."""
        return len(self.generations) - 1

    def tree_heights(self):
        heights = []

        for (index, start) in enumerate(self.tree_starts[:-1]):
            stop = self.tree_starts[index + 1]

            heights.append(max(self.depth(vertex) for vertex in range(start, stop)))

        return heights

    def count_at_height(self, h):
        return len(self.generation(h))

    def truncate(self, h):
        """The forest restricted to generations 0..h."""
        levels = self.levels()[:h + 1]

        if levels:
            levels[-1] = [0] * len(levels[-1])

        return PlaneForest.from_levels(levels)

    def to_json(self):
        return {'trees': [list(tree) for tree in self.trees]}

    @classmethod
    def from_json(cls, data):
        return cls(data['trees'])

    def sequence(self):
        """Child counts with a -1 separator after each tree."""
        return [value for tree in self.trees for value in (*tree, -1)]

    @classmethod
    def from_sequence(cls, values):
        chunks = list(split_after(values, lambda value: value == -1))

        if chunks and chunks[-1][-1] != -1:
            raise ForestError('sequence must end with a tree separator')

        return cls(chunk[:-1] for chunk in chunks)

def is_lukasiewicz(tree):
    """Partial sums of (c − 1) stay nonnegative and end at −1."""
    if not tree:
        return False

    total = 0

    for (index, c) in enumerate(tree):
        if c < 0:
            return False

        total += c - 1

        if total < 0 and index != len(tree) - 1:
            return False

    return total == -1
