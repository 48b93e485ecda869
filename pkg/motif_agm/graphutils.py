import numpy as np

from motif_agm.errors import (CommunityFileError, EmptyGraphError,
                              GraphFormatError, UndecodableFileError)
from motif_agm.graph import Graph


class GraphUtils(object):
    @classmethod
    def text_lines(cls, path):
        """(line number, line) pairs of a UTF-8 text file."""
        try:
            with open(path, encoding='utf-8') as f:
                return list(enumerate(f, 1))
        except UnicodeDecodeError as e:
            raise UndecodableFileError(path, e)

    @classmethod
    def load_edge_list(cls, path):
        """Reads a SNAP-style edge list: one whitespace-separated pair of
        integer vertex ids per line, '#' lines ignored.  Vertex ids are
        compacted to 0..V-1 in ascending order of the original id.
        """
        pairs = []
        for line_number, line in cls.text_lines(path):
            stripped = line.strip()
            if not stripped or stripped.startswith('#'):
                continue
            tokens = stripped.split()
            if len(tokens) != 2:
                raise GraphFormatError(path, line_number, line)
            try:
                pairs.append((int(tokens[0]), int(tokens[1])))
            except ValueError:
                raise GraphFormatError(path, line_number, line)

        pairs = [(u, v) for u, v in pairs if u != v]
        if not pairs:
            raise EmptyGraphError(path)

        raw = np.array(pairs, dtype=np.int64)
        vertex_ids, compact = np.unique(raw, return_inverse=True)
        compact = compact.reshape(raw.shape)
        return Graph.from_edges(len(vertex_ids), compact, vertex_ids)

    @classmethod
    def write_edge_list(cls, g, path):
        with open(path, 'w', encoding='utf-8') as f:
            f.write("# Undirected graph: %d vertices, %d edges\n" %
                    (g.vertex_count, g.edge_count))
            for u, v in g.edges():
                f.write("%d\t%d\n" % (g.original_id(u), g.original_id(v)))

    @classmethod
    def read_community_lines(cls, path):
        communities = []
        for line_number, line in cls.text_lines(path):
            stripped = line.strip()
            if not stripped or stripped.startswith('#'):
                continue
            try:
                communities.append(frozenset(int(t)
                                             for t in stripped.split()))
            except ValueError:
                raise CommunityFileError(
                    path, "non-integer vertex id on line %d" % line_number)
        if not communities:
            raise CommunityFileError(path, "no communities")
        return communities

    @classmethod
    def load_communities(cls, path, g=None):
        """Returns one frozenset per community.  With a graph, original
        ids are translated to the graph's compact ids.
        """
        communities = cls.read_community_lines(path)
        if g is None:
            return communities

        translated = []
        for community in communities:
            missing = [v for v in community if v not in g.index_of]
            if missing:
                raise CommunityFileError(
                    path, "vertex %d is not in the graph" % missing[0])
            translated.append(frozenset(g.index_of[v] for v in community))
        return translated

    @classmethod
    def write_communities(cls, communities, path, g=None):
        with open(path, 'w', encoding='utf-8') as f:
            for community in communities:
                members = sorted(community)
                if g is not None:
                    members = sorted(g.original_id(v) for v in members)
                f.write(" ".join(str(v) for v in members) + "\n")
