class MotifAGMError(Exception):
    exit_code = 1

    def message(self):
        return str(self)


class InputError(MotifAGMError):
    exit_code = 2


class GraphFormatError(InputError):
    def __init__(self, path, line_number, line):
        self.path = path
        self.line_number = line_number
        self.line = line

    def message(self):
        return "%s:%d: expected two integer vertex ids, got %r" % \
            (self.path, self.line_number, self.line.rstrip("\n"))


class EmptyGraphError(InputError):
    def __init__(self, path):
        self.path = path

    def message(self):
        return "No edges found in %s" % self.path


class UndecodableFileError(InputError):
    def __init__(self, path, error):
        self.path = path
        self.error = error

    def message(self):
        return "%s is not valid UTF-8 text: %s" % (self.path, self.error)


class CommunityFileError(InputError):
    def __init__(self, path, reason):
        self.path = path
        self.reason = reason

    def message(self):
        return "Invalid community file %s: %s" % (self.path, self.reason)


class CheckpointError(InputError):
    def __init__(self, path, reason):
        self.path = path
        self.reason = reason

    def message(self):
        return "Cannot resume from %s: %s" % (self.path, self.reason)


class ParameterError(MotifAGMError):
    exit_code = 2


class NoCliquesError(MotifAGMError):
    exit_code = 2

    def __init__(self, clique_size):
        self.clique_size = clique_size

    def message(self):
        return "Graph contains no %d-cliques; try a smaller --clique-size" % \
            self.clique_size


class DegenerateSplitError(MotifAGMError):
    exit_code = 2


class GenerationFailure(MotifAGMError):
    def __init__(self, vertex):
        self.vertex = vertex

    def message(self):
        return "Could not generate a vertex subset rooted at %d" % self.vertex


class GuardRefusal(MotifAGMError):
    exit_code = 3
